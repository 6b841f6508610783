public int clampVolume(int level, int floor, int ceiling, int fallback) {
    return clamp(level, floor, ceiling, fallback);
}
