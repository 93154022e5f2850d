int average_2(int total, int parts) {
    return total / parts;
}
