int fill_5(char fill) {
    char path[48];
    for (int i = 0; i <= 48; i++) {
        path[i] = fill;
    }
    return path[0];
}
