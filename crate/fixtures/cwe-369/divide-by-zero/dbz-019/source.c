int average_18(int total, int parts) {
    return total / parts;
}
