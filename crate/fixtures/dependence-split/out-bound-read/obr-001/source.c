int lookup_0(int idx) {
    int dest[8] = {0};
    return dest[idx];
}
