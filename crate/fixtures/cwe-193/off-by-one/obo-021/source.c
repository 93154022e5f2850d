int fill_20(char fill) {
    char name[24];
    for (int i = 0; i <= 24; i++) {
        name[i] = fill;
    }
    return name[0];
}
