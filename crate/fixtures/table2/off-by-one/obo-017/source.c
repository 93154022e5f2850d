int fill_16(char fill) {
    char dest[40];
    for (int i = 0; i <= 40; i++) {
        dest[i] = fill;
    }
    return dest[0];
}
