int fill_9(char fill) {
    char buf[32];
    for (int i = 0; i <= 32; i++) {
        buf[i] = fill;
    }
    return buf[0];
}
