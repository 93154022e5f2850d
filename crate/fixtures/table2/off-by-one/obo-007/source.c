int fill_6(char fill) {
    char field[8];
    for (int i = 0; i <= 8; i++) {
        field[i] = fill;
    }
    return field[0];
}
