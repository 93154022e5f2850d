int lookup_10(int idx) {
    int out[40] = {0};
    return out[idx];
}
