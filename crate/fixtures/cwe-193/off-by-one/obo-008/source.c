int fill_7(char fill) {
    char tmp[16];
    for (int i = 0; i <= 16; i++) {
        tmp[i] = fill;
    }
    return tmp[0];
}
