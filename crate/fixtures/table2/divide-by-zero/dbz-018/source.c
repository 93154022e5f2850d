int average_17(int total, int width) {
    return total / width;
}
