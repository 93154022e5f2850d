int lookup_6(int idx) {
    int field[8] = {0};
    return field[idx];
}
