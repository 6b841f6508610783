public boolean permit(boolean a, boolean b) {
    return a && b && open();
}
