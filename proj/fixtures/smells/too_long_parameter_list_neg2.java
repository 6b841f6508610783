public void scaleBox(int width, int height, String unit, String label) {
    resize(width, height);
    relabel(unit, label);
}
