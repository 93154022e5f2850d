int fill_10(char fill) {
    char out[40];
    for (int i = 0; i <= 40; i++) {
        out[i] = fill;
    }
    return out[0];
}
