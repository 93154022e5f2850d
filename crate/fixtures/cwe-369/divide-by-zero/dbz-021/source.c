int average_20(int total, int count) {
    return total / count;
}
