int average_10(int total, int parts) {
    return total / parts;
}
