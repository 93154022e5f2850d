int fill_12(char fill) {
    char name[8];
    for (int i = 0; i <= 8; i++) {
        name[i] = fill;
    }
    return name[0];
}
