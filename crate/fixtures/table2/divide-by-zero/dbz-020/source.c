int average_19(int total, int divisor) {
    return total / divisor;
}
