int average_21(int total, int width) {
    return total / width;
}
