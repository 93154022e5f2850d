int lookup_18(int idx) {
    int out[8] = {0};
    return out[idx];
}
