public int addPair(int left, int right) {
    return plus(left, right);
}
