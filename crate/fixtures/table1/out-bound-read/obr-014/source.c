int lookup_13(int idx) {
    int path[16] = {0};
    return path[idx];
}
