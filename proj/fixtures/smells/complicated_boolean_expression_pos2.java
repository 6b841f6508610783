public boolean reject(boolean a, boolean b) {
    return a || !b || expired() || locked();
}
