public int bumpEight(int seed) {
    int total = seed;
    total++;
    total++;
    total++;
    total++;
    total--;
    total--;
    total--;
    return total;
}
