import logging
import os
import sqlite3
from datetime import datetime

logger = logging.getLogger("RunDatabase")


class RunDatabase:
    def __init__(self, db_path=None):
        """打开运行记录数据库

        Args:
            db_path: 数据库文件路径，如未指定则使用用户目录下的.cbf_sim/runs.db
        """
        if db_path is None:
            # 默认使用用户主目录下的.cbf_sim文件夹
            db_path = os.path.join(os.path.expanduser('~'), '.cbf_sim', 'runs.db')
        self.db_path = db_path

        logger.debug(f"使用数据库: {self.db_path}")
        self.conn = None
        self.cursor = None
        self.connect()
        self.create_tables()

    def connect(self):
        """Connect to the database"""
        db_dir = os.path.dirname(self.db_path)
        if db_dir and not os.path.exists(db_dir):
            os.makedirs(db_dir)
        self.conn = sqlite3.connect(self.db_path)
        self.cursor = self.conn.cursor()

    def close(self):
        """Close database connection"""
        if self.conn:
            self.conn.close()
            self.conn = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()

    def create_tables(self):
        self.cursor.execute('''
            CREATE TABLE IF NOT EXISTS run_history (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                scenario TEXT NOT NULL,
                plant TEXT NOT NULL,
                status TEXT NOT NULL,
                exit_code INTEGER NOT NULL,
                min_h REAL,
                min_psi1 REAL,
                goal_distance REAL,
                infeasible_steps INTEGER DEFAULT 0,
                simulated_time REAL DEFAULT 0,
                out_dir TEXT,
                timestamp TEXT NOT NULL
            )
        ''')
        self.conn.commit()

    def add_run(self, summary, out_dir=None):
        """Record a finished run; summary is a RunSummary or its dict form"""
        data = summary.to_dict() if hasattr(summary, "to_dict") else dict(summary)
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        try:
            self.cursor.execute(
                "INSERT INTO run_history (scenario, plant, status, exit_code, min_h, min_psi1, goal_distance, "
                "infeasible_steps, simulated_time, out_dir, timestamp) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (data["name"], data["plant"], data["status"], data["exit_code"], data["min_h"],
                 data["min_psi1"], data["final_goal_distance"], data["infeasible_steps"],
                 data["simulated_time"], out_dir, timestamp)
            )
            self.conn.commit()
            return self.cursor.lastrowid
        except sqlite3.Error as e:
            logger.error(f"添加运行记录出错: {str(e)}")
            return None

    def get_run_history(self, limit=50, offset=0, scenario=None, status=None):
        """Newest runs first, optionally filtered by scenario name and status"""
        query = "SELECT * FROM run_history"
        params = []

        conditions = []
        if scenario:
            conditions.append("scenario = ?")
            params.append(scenario)
        if status:
            conditions.append("status = ?")
            params.append(status)
        if conditions:
            query += " WHERE " + " AND ".join(conditions)

        query += " ORDER BY id DESC LIMIT ? OFFSET ?"
        params.extend([limit, offset])

        self.cursor.execute(query, params)
        return self.cursor.fetchall()

    def delete_run(self, run_id):
        self.cursor.execute("DELETE FROM run_history WHERE id = ?", (run_id,))
        self.conn.commit()
        return self.cursor.rowcount > 0
