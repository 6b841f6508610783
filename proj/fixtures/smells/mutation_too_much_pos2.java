public int tallyAll(int seed) {
    int total = seed;
    total = fold(total, 1);
    total = fold(total, 2);
    total = fold(total, 3);
    total = fold(total, 4);
    total = fold(total, 5);
    total = fold(total, 6);
    total++;
    total++;
    total--;
    total++;
    total--;
    return total;
}
