int fill_21(char fill) {
    char path[32];
    for (int i = 0; i <= 32; i++) {
        path[i] = fill;
    }
    return path[0];
}
