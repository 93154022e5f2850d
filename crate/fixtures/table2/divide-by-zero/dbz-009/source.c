int average_8(int total, int count) {
    return total / count;
}
