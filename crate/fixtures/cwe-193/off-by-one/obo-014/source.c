int fill_13(char fill) {
    char path[16];
    for (int i = 0; i <= 16; i++) {
        path[i] = fill;
    }
    return path[0];
}
