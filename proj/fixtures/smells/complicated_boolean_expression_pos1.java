public boolean admit(boolean a, boolean b) {
    if (a && b || open() && closed() && stale()) {
        return true;
    }
    return false;
}
