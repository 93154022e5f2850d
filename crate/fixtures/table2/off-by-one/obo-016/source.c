int fill_15(char fill) {
    char tmp[32];
    for (int i = 0; i <= 32; i++) {
        tmp[i] = fill;
    }
    return tmp[0];
}
