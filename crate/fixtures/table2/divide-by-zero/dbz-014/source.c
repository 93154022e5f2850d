int average_13(int total, int width) {
    return total / width;
}
