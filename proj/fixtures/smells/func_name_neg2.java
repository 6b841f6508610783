public double computeAverage(double total, int count) {
    return divide(total, count);
}
