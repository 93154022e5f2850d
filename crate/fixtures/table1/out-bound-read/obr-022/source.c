int lookup_21(int idx) {
    int path[32] = {0};
    return path[idx];
}
