int average_11(int total, int divisor) {
    return total / divisor;
}
