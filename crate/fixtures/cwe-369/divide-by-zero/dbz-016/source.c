int average_15(int total, int divisor) {
    return total / divisor;
}
