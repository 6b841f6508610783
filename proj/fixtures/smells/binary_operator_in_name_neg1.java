public void handleRequest(String request) {
    route(request);
}
