int fill_18(char fill) {
    char out[8];
    for (int i = 0; i <= 8; i++) {
        out[i] = fill;
    }
    return out[0];
}
