int lookup_11(int idx) {
    int line[48] = {0};
    return line[idx];
}
