double rate(long bytes, long millis) {
    long seconds = millis / 1000;
    return (double)bytes / seconds;
}
