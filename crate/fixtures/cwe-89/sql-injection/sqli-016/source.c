#include <stdio.h>
#include <sqlite3.h>

int find_user_15(sqlite3 *db, const char *name) {
    char query[256];
    snprintf(query, sizeof(query), "SELECT id FROM users WHERE name = '%s'", name);
    return sqlite3_exec(db, query, NULL, NULL, NULL);
}
