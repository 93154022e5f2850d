int average_3(int total, int divisor) {
    return total / divisor;
}
