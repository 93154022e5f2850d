unsigned bucket(unsigned hash, unsigned buckets) {
    return hash % buckets;
}
