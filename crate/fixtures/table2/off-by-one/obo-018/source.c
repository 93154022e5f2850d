int fill_17(char fill) {
    char buf[48];
    for (int i = 0; i <= 48; i++) {
        buf[i] = fill;
    }
    return buf[0];
}
