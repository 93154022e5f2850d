int average_16(int total, int count) {
    return total / count;
}
