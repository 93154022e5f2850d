struct node {
    int value;
    struct node *next;
};

int second_value(struct node *head) {
    struct node *second = head->next;
    return second->value;
}
