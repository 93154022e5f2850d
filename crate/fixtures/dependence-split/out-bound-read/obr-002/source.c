int lookup_1(int idx) {
    int buf[16] = {0};
    return buf[idx];
}
