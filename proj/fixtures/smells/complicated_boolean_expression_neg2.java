public boolean review(boolean a, boolean b) {
    if (a && b) { return true; }
    return !a && b;
}
