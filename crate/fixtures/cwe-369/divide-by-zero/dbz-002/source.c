int average_1(int total, int width) {
    return total / width;
}
