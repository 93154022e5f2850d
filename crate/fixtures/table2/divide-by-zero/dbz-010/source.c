int average_9(int total, int width) {
    return total / width;
}
