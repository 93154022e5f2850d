int lookup_8(int idx) {
    int dest[24] = {0};
    return dest[idx];
}
