#include <stdio.h>
#include <sqlite3.h>

int find_user_3(sqlite3 *db, const char *email) {
    char query[256];
    snprintf(query, sizeof(query), "SELECT id FROM users WHERE name = '%s'", email);
    return sqlite3_exec(db, query, NULL, NULL, NULL);
}
