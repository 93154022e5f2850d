int fill_3(char fill) {
    char line[32];
    for (int i = 0; i <= 32; i++) {
        line[i] = fill;
    }
    return line[0];
}
