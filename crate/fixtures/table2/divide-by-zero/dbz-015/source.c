int average_14(int total, int parts) {
    return total / parts;
}
