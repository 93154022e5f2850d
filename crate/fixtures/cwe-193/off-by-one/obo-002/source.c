int fill_1(char fill) {
    char buf[16];
    for (int i = 0; i <= 16; i++) {
        buf[i] = fill;
    }
    return buf[0];
}
