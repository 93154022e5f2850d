int fill_11(char fill) {
    char line[48];
    for (int i = 0; i <= 48; i++) {
        line[i] = fill;
    }
    return line[0];
}
