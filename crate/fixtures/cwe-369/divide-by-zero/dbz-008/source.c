int average_7(int total, int divisor) {
    return total / divisor;
}
