public void labelPoint(int x, int y, String label) {
    annotate(x, y, label);
}
