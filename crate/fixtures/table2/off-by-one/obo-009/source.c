int fill_8(char fill) {
    char dest[24];
    for (int i = 0; i <= 24; i++) {
        dest[i] = fill;
    }
    return dest[0];
}
