public String joinHost(String host) {
    return host.replaceAll("local", "remote");
}
