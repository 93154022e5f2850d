int checksum(const int *samples, int count) {
    int window[8];
    int sum = 0;
    for (int i = 0; i < 8; i++) {
        window[i] = samples[i];
    }
    for (int i = 0; i < count; i++) {
        sum += window[i];
    }
    return sum;
}
