public boolean matchesRange(String input) {
    return input.matches("^(a+|b*)?[c-d]{2}$");
}
