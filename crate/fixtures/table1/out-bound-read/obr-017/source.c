int lookup_16(int idx) {
    int dest[40] = {0};
    return dest[idx];
}
