int lookup_19(int idx) {
    int line[16] = {0};
    return line[idx];
}
