#include <stdio.h>
#include <sqlite3.h>

int find_user_4(sqlite3 *db, const char *account) {
    char query[256];
    snprintf(query, sizeof(query), "SELECT id FROM users WHERE name = '%s'", account);
    return sqlite3_exec(db, query, NULL, NULL, NULL);
}
