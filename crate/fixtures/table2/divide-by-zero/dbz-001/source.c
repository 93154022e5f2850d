int average_0(int total, int count) {
    return total / count;
}
