int lookup_7(int idx) {
    int tmp[16] = {0};
    return tmp[idx];
}
