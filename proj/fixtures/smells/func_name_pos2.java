public void ProcessData(String payload) {
    consume(payload);
}
