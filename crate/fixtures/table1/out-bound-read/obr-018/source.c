int lookup_17(int idx) {
    int buf[48] = {0};
    return buf[idx];
}
