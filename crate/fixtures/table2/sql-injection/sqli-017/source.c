#include <stdio.h>
#include <sqlite3.h>

int find_user_16(sqlite3 *db, const char *user) {
    char query[256];
    snprintf(query, sizeof(query), "SELECT id FROM users WHERE name = '%s'", user);
    return sqlite3_exec(db, query, NULL, NULL, NULL);
}
