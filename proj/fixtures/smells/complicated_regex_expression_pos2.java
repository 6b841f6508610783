public boolean looksLikeVersion(String input) {
    java.util.regex.Pattern p = java.util.regex.Pattern.compile("(\\d+)\\.(\\d+)\\.(\\d+)");
    return p.matcher(input).find();
}
