public void checkOrRetry(String job) {
    inspect(job);
    requeue(job);
}
