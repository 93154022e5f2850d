int fill_4(char fill) {
    char name[40];
    for (int i = 0; i <= 40; i++) {
        name[i] = fill;
    }
    return name[0];
}
