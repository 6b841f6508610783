public void run(String job) {
    dispatch(job);
}
