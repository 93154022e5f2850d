int fill_0(char fill) {
    char dest[8];
    for (int i = 0; i <= 8; i++) {
        dest[i] = fill;
    }
    return dest[0];
}
