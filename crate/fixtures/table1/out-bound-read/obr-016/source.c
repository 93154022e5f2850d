int lookup_15(int idx) {
    int tmp[32] = {0};
    return tmp[idx];
}
