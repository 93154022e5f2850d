int lookup_3(int idx) {
    int line[32] = {0};
    return line[idx];
}
