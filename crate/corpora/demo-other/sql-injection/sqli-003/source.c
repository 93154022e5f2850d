#include <stdio.h>
#include <sqlite3.h>

int count_orders(sqlite3 *db, const char *email) {
    sqlite3_stmt *stmt;
    char sql[256];
    snprintf(sql, sizeof(sql), "SELECT COUNT(*) FROM orders WHERE email = '%s'", email);
    if (sqlite3_prepare_v2(db, sql, -1, &stmt, NULL) != SQLITE_OK) {
        return -1;
    }
    int rc = sqlite3_step(stmt);
    sqlite3_finalize(stmt);
    return rc;
}
