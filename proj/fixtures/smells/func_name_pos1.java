public int a(int value) {
    return value;
}
