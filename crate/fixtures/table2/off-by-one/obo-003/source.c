int fill_2(char fill) {
    char out[24];
    for (int i = 0; i <= 24; i++) {
        out[i] = fill;
    }
    return out[0];
}
