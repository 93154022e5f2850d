int fill_14(char fill) {
    char field[24];
    for (int i = 0; i <= 24; i++) {
        field[i] = fill;
    }
    return field[0];
}
