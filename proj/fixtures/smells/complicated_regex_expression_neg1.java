public boolean isLiteralTag(String input) {
    return input.matches("release");
}
