int fill_19(char fill) {
    char line[16];
    for (int i = 0; i <= 16; i++) {
        line[i] = fill;
    }
    return line[0];
}
