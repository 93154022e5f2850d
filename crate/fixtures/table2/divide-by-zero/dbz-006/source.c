int average_5(int total, int width) {
    return total / width;
}
