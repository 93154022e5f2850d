int lookup_14(int idx) {
    int field[24] = {0};
    return field[idx];
}
