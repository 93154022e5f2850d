int lookup_9(int idx) {
    int buf[32] = {0};
    return buf[idx];
}
