int average_4(int total, int count) {
    return total / count;
}
