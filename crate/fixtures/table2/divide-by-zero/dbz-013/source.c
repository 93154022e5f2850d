int average_12(int total, int count) {
    return total / count;
}
