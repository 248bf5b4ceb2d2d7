"""Deterministic synthetic logs shaped like the LogHub 2k samples.

The real samples cannot be fetched in every environment, so each system
here gets a small generator that mimics its line layout: header fields,
monotone timestamps, pid pools, block ids, IPs and so on. The output is
a pure function of ``(system, n_lines, seed)``.
"""

from __future__ import annotations

import datetime as _dt
import os
import random
from pathlib import Path
from typing import Callable, Dict, List, Optional

SYSTEMS = (
    "HDFS", "Hadoop", "Spark", "Zookeeper", "BGL", "HPC", "Thunderbird", "Windows",
    "Linux", "Android", "HealthApp", "Apache", "Proxifier", "OpenSSH", "OpenStack", "Mac",
)

MONTHS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")
DAYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


class _Clock:
    def __init__(self, rng: random.Random, start: _dt.datetime, max_step_ms: int):
        self.rng = rng
        self.t = start
        self.max_step = max_step_ms

    def tick(self) -> _dt.datetime:
        self.t += _dt.timedelta(milliseconds=self.rng.randint(0, self.max_step))
        return self.t


def _ip(rng: random.Random, pool: Optional[List[str]] = None) -> str:
    if pool and rng.random() < 0.8:
        return rng.choice(pool)
    return ".".join(str(rng.randint(1, 254)) for _ in range(4))


def _hex(rng: random.Random, n: int) -> str:
    return "%0*x" % (n, rng.getrandbits(4 * n))


def _uuid(rng: random.Random) -> str:
    h = _hex(rng, 32)
    return f"{h[:8]}-{h[8:12]}-{h[12:16]}-{h[16:20]}-{h[20:]}"


def _hdfs(rng, n):
    clock = _Clock(rng, _dt.datetime(2008, 11, 9, 20, 35, 18), 900)
    blocks = [rng.choice((1, -1)) * rng.getrandbits(62) for _ in range(n // 6 + 5)]
    nodes = [f"10.251.{rng.randint(30, 220)}.{rng.randint(2, 250)}" for _ in range(40)]
    out = []
    for _ in range(n):
        t = clock.tick()
        pid = rng.choice((13, 19, 31, 145, 148, 222, 567, 2561))
        blk = f"blk_{rng.choice(blocks)}"
        a, b = rng.choice(nodes), rng.choice(nodes)
        k = rng.random()
        if k < 0.3:
            msg = f"INFO dfs.DataNode$PacketResponder: PacketResponder {rng.randint(0, 2)} for block {blk} terminating"
        elif k < 0.55:
            msg = (f"INFO dfs.DataNode$PacketResponder: Received block {blk} of size "
                   f"{rng.choice((67108864, rng.randint(1000, 67108864)))} from /{a}")
        elif k < 0.8:
            msg = f"INFO dfs.DataNode$DataXceiver: Receiving block {blk} src: /{a}:{rng.randint(30000, 60000)} dest: /{b}:50010"
        elif k < 0.95:
            msg = (f"INFO dfs.FSNamesystem: BLOCK* NameSystem.addStoredBlock: blockMap updated: "
                   f"{a}:50010 is added to {blk} size {rng.randint(1000, 67108864)}")
        else:
            msg = (f"INFO dfs.FSNamesystem: BLOCK* NameSystem.allocateBlock: /user/root/rand/_temporary/"
                   f"_task_200811092030_0001_m_{rng.randint(0, 2000):06d}_0/part-{rng.randint(0, 2000):05d}. {blk}")
        out.append(f"{t:%y%m%d %H%M%S} {pid} {msg}")
    return out


def _hadoop(rng, n):
    clock = _Clock(rng, _dt.datetime(2015, 10, 18, 18, 1, 47), 400)
    app = "1445144423722_0020"
    out = []
    for _ in range(n):
        t = clock.tick()
        ts = f"{t:%Y-%m-%d %H:%M:%S},{t.microsecond // 1000:03d}"
        att = f"attempt_{app}_m_{rng.randint(0, 12):06d}_{rng.randint(0, 1)}"
        k = rng.random()
        if k < 0.25:
            line = (f"INFO [RMCommunicator Allocator] org.apache.hadoop.mapreduce.v2.app.rm.RMContainerAllocator: "
                    f"Recalculating schedule, headroom=<memory:{rng.randint(0, 20) * 1024}, vCores:{rng.randint(-20, 5)}>")
        elif k < 0.45:
            line = (f"INFO [AsyncDispatcher event handler] org.apache.hadoop.mapreduce.v2.app.job.impl.TaskAttemptImpl: "
                    f"{att} TaskAttempt Transitioned from ASSIGNED to RUNNING")
        elif k < 0.6:
            line = (f"INFO [IPC Server handler {rng.randint(0, 29)} on {rng.choice((62270, 41093))}] "
                    f"org.apache.hadoop.mapred.TaskAttemptListenerImpl: Progress of TaskAttempt {att} is : "
                    f"{rng.random():.8f}")
        elif k < 0.75:
            line = (f"WARN [LeaseRenewer:msrabi@msra-sa-41:9000] org.apache.hadoop.hdfs.LeaseRenewer: "
                    f"Failed to renew lease for [DFSClient_NONMAPREDUCE_{rng.randint(10**8, 10**9)}_1] for "
                    f"{rng.randint(30, 400)} seconds.  Will retry shortly ...")
        elif k < 0.9:
            line = (f"INFO [main] org.apache.hadoop.mapreduce.v2.app.MRAppMaster: Created MRAppMaster for application "
                    f"appattempt_{app}_{rng.randint(1, 2):06d}")
        else:
            line = (f"ERROR [RMCommunicator Allocator] org.apache.hadoop.mapreduce.v2.app.rm.RMContainerAllocator: "
                    f"ERROR IN CONTACTING RM.")
        out.append(f"{ts} {line}")
    return out


def _spark(rng, n):
    clock = _Clock(rng, _dt.datetime(2017, 6, 9, 20, 10, 40), 700)
    out = []
    for _ in range(n):
        t = clock.tick()
        k = rng.random()
        if k < 0.3:
            msg = (f"INFO storage.BlockManager: Found block rdd_{rng.randint(0, 50)}_{rng.randint(0, 40)} locally")
        elif k < 0.5:
            msg = (f"INFO executor.Executor: Finished task {rng.randint(0, 40)}.0 in stage {rng.randint(0, 30)}.0 "
                   f"(TID {rng.randint(0, 2000)}). {rng.randint(800, 3000)} bytes result sent to driver")
        elif k < 0.65:
            msg = (f"INFO executor.CoarseGrainedExecutorBackend: Got assigned task {rng.randint(0, 2000)}")
        elif k < 0.8:
            msg = (f"INFO storage.MemoryStore: Block broadcast_{rng.randint(0, 30)} stored as values in memory "
                   f"(estimated size {rng.randint(1, 400)}.{rng.randint(0, 9)} KB, free {rng.randint(100, 400)}.{rng.randint(0, 9)} KB)")
        elif k < 0.9:
            msg = (f"INFO spark.CacheManager: Partition rdd_{rng.randint(0, 50)}_{rng.randint(0, 40)} not found, computing it")
        else:
            msg = (f"INFO broadcast.TorrentBroadcast: Reading broadcast variable {rng.randint(0, 30)} took "
                   f"{rng.randint(5, 200)} ms")
        out.append(f"{t:%y/%m/%d %H:%M:%S} {msg}")
    return out


def _zookeeper(rng, n):
    clock = _Clock(rng, _dt.datetime(2015, 7, 29, 17, 41, 44), 3000)
    peers = ["10.10.34.%d" % i for i in range(11, 14)]
    out = []
    for _ in range(n):
        t = clock.tick()
        ts = f"{t:%Y-%m-%d %H:%M:%S},{t.microsecond // 1000:03d}"
        myid = rng.randint(1, 3)
        k = rng.random()
        if k < 0.3:
            line = (f"- INFO  [QuorumPeer[myid={myid}]/0:0:0:0:0:0:0:0:2181:FastLeaderElection@774] - "
                    f"Notification time out: {rng.choice((3200, 6400, 12800, 25600, 51200, 60000))}")
        elif k < 0.55:
            line = (f"- WARN  [SendWorker:{rng.randint(1, 3)}:QuorumCnxManager$SendWorker@688] - "
                    f"Send worker leaving thread")
        elif k < 0.75:
            line = (f"- INFO  [NIOServerCxn.Factory:0.0.0.0/0.0.0.0:2181:NIOServerCnxnFactory@197] - "
                    f"Accepted socket connection from /{rng.choice(peers)}:{rng.randint(30000, 60000)}")
        elif k < 0.9:
            line = (f"- INFO  [NIOServerCxn.Factory:0.0.0.0/0.0.0.0:2181:NIOServerCnxn@1001] - Closed socket connection "
                    f"for client /{rng.choice(peers)}:{rng.randint(30000, 60000)} which had sessionid "
                    f"0x{rng.randint(1, 3)}4ed93119{_hex(rng, 4)}")
        else:
            line = (f"- WARN  [RecvWorker:{rng.randint(1, 3)}:QuorumCnxManager$RecvWorker@765] - "
                    f"Interrupting SendWorker")
        out.append(f"{ts} {line}")
    return out


def _bgl(rng, n):
    clock = _Clock(rng, _dt.datetime(2005, 6, 3, 15, 42, 50), 4000)
    out = []
    for _ in range(n):
        t = clock.tick()
        epoch = int(t.replace(tzinfo=_dt.timezone.utc).timestamp())
        loc = f"R{rng.randint(0, 7):02d}-M{rng.randint(0, 1)}-N{rng.choice('0123456789ABCDEF')}-C:J{rng.randint(2, 17):02d}-U{rng.choice((1, 11))}"
        k = rng.random()
        if k < 0.4:
            msg = "RAS KERNEL INFO instruction cache parity error corrected"
        elif k < 0.6:
            msg = f"RAS KERNEL INFO generating core.{rng.randint(100, 9999)}"
        elif k < 0.75:
            msg = f"RAS KERNEL INFO {rng.randint(1, 999)} double-hummer alignment exceptions"
        elif k < 0.9:
            msg = (f"RAS KERNEL FATAL data TLB error interrupt")
        else:
            msg = f"RAS APP FATAL ciod: failed to read message prefix on control stream (CioStream socket to 172.16.96.116:{rng.randint(30000, 40000)}"
        alert = "-" if rng.random() < 0.9 else "KERNDTLB"
        out.append(f"{alert} {epoch} {t:%Y.%m.%d} {loc} {t:%Y-%m-%d-%H.%M.%S}.{t.microsecond:06d} {loc} {msg}")
    return out


def _hpc(rng, n):
    clock = _Clock(rng, _dt.datetime(2004, 2, 24, 5, 0, 0), 60000)
    rid = 134681
    out = []
    for _ in range(n):
        t = clock.tick()
        epoch = int(t.replace(tzinfo=_dt.timezone.utc).timestamp())
        rid += rng.randint(1, 40)
        node = f"node-{rng.randint(0, 255)}"
        k = rng.random()
        if k < 0.3:
            line = (f"{node} unix.hw state_change.unavailable {epoch} 1 Component State Change: Component "
                    f"\\042alt0\\042 is in the unavailable state (HWID={rng.randint(1000, 5000)})")
        elif k < 0.55:
            line = (f"{node} action start {epoch} 1 clusterAddMember  (command {rng.randint(1000, 3000)})")
        elif k < 0.75:
            line = (f"gige{rng.randint(0, 7)} node psu failure\\ {epoch} 1 ambient={rng.randint(20, 45)}")
        elif k < 0.9:
            line = (f"{node} boot_cmd new {epoch} 1 Targeting domains:{node} and nodes:{node} child of command {rng.randint(2000, 3000)}")
        else:
            line = (f"{node} node status {epoch} 1 running")
        out.append(f"{rid} {line}")
    return out


def _thunderbird(rng, n):
    clock = _Clock(rng, _dt.datetime(2005, 11, 9, 12, 1, 1), 3000)
    hosts = [f"dn{rng.randint(1, 999)}" for _ in range(30)] + [f"bn{rng.randint(1, 999)}" for _ in range(10)]
    out = []
    for _ in range(n):
        t = clock.tick()
        epoch = int(t.replace(tzinfo=_dt.timezone.utc).timestamp())
        h = rng.choice(hosts)
        k = rng.random()
        if k < 0.35:
            msg = f"crond(pam_unix)[{rng.randint(1000, 30000)}]: session closed for user root"
        elif k < 0.7:
            msg = f"crond(pam_unix)[{rng.randint(1000, 30000)}]: session opened for user root by (uid=0)"
        elif k < 0.85:
            msg = f"crond[{rng.randint(1000, 30000)}]: (root) CMD (run-parts /etc/cron.hourly)"
        else:
            msg = (f"kernel: EXT3-fs error (device sda{rng.randint(1, 9)}): ext3_lookup: unlinked inode "
                   f"{rng.randint(10**6, 10**7)} in dir #{rng.randint(10**5, 10**6)}")
        out.append(f"- {epoch} {t:%Y.%m.%d} {h} {MONTHS[t.month - 1]} {t.day} {t:%H:%M:%S} {h}/{h} {msg}")
    return out


def _windows(rng, n):
    clock = _Clock(rng, _dt.datetime(2016, 9, 28, 4, 30, 30), 2000)
    out = []
    for _ in range(n):
        t = clock.tick()
        k = rng.random()
        if k < 0.35:
            msg = (f"Info                  CBS    SQM: Initializing online with Windows opt-in: False")
        elif k < 0.6:
            msg = (f"Info                  CBS    Session: 30546174_{rng.randint(10**9, 4 * 10**9)} initialized by client "
                   f"WindowsUpdateAgent.")
        elif k < 0.8:
            msg = (f"Info                  CSI    {rng.randint(1, 0xfff):08x}@2016/9/28:{t:%H:%M:%S}.{rng.randint(0, 999):03d} "
                   f"WcpInitialize (wcp.dll version 0.0.0.6) called (stack @0x7fed806eb5d @0x7fef9fb9b6d "
                   f"@0x7fef9f8358f @0xffa1e474 @0xffa1d6a5 @0xffa1d4bd)")
        else:
            msg = (f"Info                  CBS    Loaded Servicing Stack v6.1.7601.23505 with Core: "
                   f"C:\\Windows\\winsxs\\amd64_microsoft-windows-servicingstack_31bf3856ad364e35_6.1.7601.23505_none_"
                   f"681aa442f6fed7f0\\cbscore.dll")
        out.append(f"{t:%Y-%m-%d %H:%M:%S}, {msg}")
    return out


def _linux(rng, n):
    clock = _Clock(rng, _dt.datetime(2005, 6, 14, 15, 16, 1), 90000)
    rhosts = [_ip(rng) for _ in range(15)]
    out = []
    for _ in range(n):
        t = clock.tick()
        pid = rng.randint(1000, 30000)
        k = rng.random()
        if k < 0.4:
            msg = (f"sshd(pam_unix)[{pid}]: authentication failure; logname= uid=0 euid=0 tty=NODEVssh ruser= "
                   f"rhost={rng.choice(rhosts)}  user=root")
        elif k < 0.6:
            msg = f"sshd(pam_unix)[{pid}]: check pass; user unknown"
        elif k < 0.8:
            msg = f"su(pam_unix)[{pid}]: session opened for user cyrus by (uid=0)"
        elif k < 0.9:
            msg = f"ftpd[{pid}]: connection from {rng.choice(rhosts)} () at {DAYS[t.weekday()]} {MONTHS[t.month - 1]} {t.day:2d} {t:%H:%M:%S} {t.year}"
        else:
            msg = f"logrotate: ALERT exited abnormally with [1]"
        out.append(f"{MONTHS[t.month - 1]} {t.day:2d} {t:%H:%M:%S} combo {msg}")
    return out


def _android(rng, n):
    clock = _Clock(rng, _dt.datetime(2017, 3, 17, 16, 13, 38), 300)
    pids = [(1702, 2395), (1702, 1820), (2227, 2227), (1702, 8671)]
    out = []
    for _ in range(n):
        t = clock.tick()
        pid, tid = rng.choice(pids)
        k = rng.random()
        if k < 0.3:
            tag, lvl = "PowerManagerService", "D"
            msg = (f"acquire lock={rng.randint(10**7, 10**9)}, flags=0x1, tag=\"View Lock\", name=com.android.systemui, "
                   f"ws=null, uid=10{rng.randint(0, 200):03d}, pid={pid}")
        elif k < 0.55:
            tag, lvl = "WindowManager", "D"
            msg = (f"printFreezingDisplayLogsopening app wtoken = AppWindowToken{{{_hex(rng, 7)} token=Token{{{_hex(rng, 7)} "
                   f"ActivityRecord{{{_hex(rng, 7)} u0 com.tencent.qt.qtl/.activity.info.NewsDetailXmlActivity "
                   f"t{rng.randint(700, 800)}}}}}}}, allDrawn= false, startingDisplayed =  false")
        elif k < 0.8:
            tag, lvl = "PowerManagerService", "D"
            msg = f"release:lock={rng.randint(10**7, 10**9)}, flg=0x0, tag=\"RILJ_ACK_WL\", name=com.android.phone\", ws=null, uid=1001, pid=2227"
        else:
            tag, lvl = "ActivityManager", "I"
            msg = f"Start proc {rng.randint(1000, 30000)}:com.tencent.mm:push/u0a{rng.randint(10, 200)} for service com.tencent.mm/.booter.CoreService"
        out.append(f"{t:%m-%d %H:%M:%S}.{t.microsecond // 1000:03d}  {pid}  {tid} {lvl} {tag}: {msg}")
    return out


def _healthapp(rng, n):
    clock = _Clock(rng, _dt.datetime(2017, 12, 23, 22, 15, 29), 500)
    steps = rng.randint(3000, 7000)
    out = []
    for _ in range(n):
        t = clock.tick()
        ts = f"{t:%Y%m%d-%H:%M:%S}:{t.microsecond // 1000}"
        k = rng.random()
        if k < 0.35:
            steps += rng.randint(0, 3)
            out.append(f"{ts}|Step_LSC|30002312|onStandStepChanged {steps}")
        elif k < 0.55:
            out.append(f"{ts}|Step_SPUtils|30002312| getTodayTotalDetailSteps = {t:%Y%m%d}##{steps * 2}##"
                       f"{rng.randint(500000, 600000)}##{rng.randint(8000, 9000)}##{rng.randint(20000, 30000)}##"
                       f"{rng.randint(10**11, 10**12)}")
        elif k < 0.7:
            out.append(f"{ts}|Step_StandReportReceiver|30002312|onReceive action: android.intent.action.SCREEN_ON")
        elif k < 0.85:
            out.append(f"{ts}|Step_LSC|30002312|processHandleBroadcastAction action:android.intent.action.TIME_TICK")
        else:
            out.append(f"{ts}|Step_ExtSDM|30002312|calculateCaloriesWithCache totalCalories={rng.randint(100000, 200000)}")
    return out


def _apache(rng, n):
    clock = _Clock(rng, _dt.datetime(2005, 12, 4, 4, 47, 44), 20000)
    out = []
    for _ in range(n):
        t = clock.tick()
        ts = f"[{DAYS[t.weekday()]} {MONTHS[t.month - 1]} {t.day:02d} {t:%H:%M:%S} {t.year}]"
        k = rng.random()
        if k < 0.3:
            line = "[notice] workerEnv.init() ok /etc/httpd/conf/workers2.properties"
        elif k < 0.55:
            line = f"[error] mod_jk child workerEnv in error state {rng.randint(6, 9)}"
        elif k < 0.8:
            line = f"[notice] jk2_init() Found child {rng.randint(1000, 30000)} in scoreboard slot {rng.randint(6, 12)}"
        elif k < 0.9:
            line = f"[error] [client {_ip(rng)}] Directory index forbidden by rule: /var/www/html/"
        else:
            line = "[error] jk2_init() Can't find child 1566 in scoreboard"
        out.append(f"{ts} {line}")
    return out


def _proxifier(rng, n):
    clock = _Clock(rng, _dt.datetime(2017, 10, 30, 16, 49, 6), 800)
    apps = ["chrome.exe", "QQ.exe", "Skype.exe", "svchost.exe"]
    out = []
    for _ in range(n):
        t = clock.tick()
        app = rng.choice(apps)
        host = rng.choice(("proxy.cse.cuhk.edu.hk:5070", "www.google.com:443", "183.62.156.108:22",
                           "get.sogou.com:80", "play.google.com:443"))
        k = rng.random()
        if k < 0.45:
            msg = f"{app} - {host} close, {rng.randint(0, 9999)} bytes sent, {rng.randint(0, 99999)} bytes received, lifetime {rng.choice(('<1 sec', '00:%02d' % rng.randint(1, 59)))}"
        elif k < 0.8:
            msg = f"{app} - {host} open through proxy proxy.cse.cuhk.edu.hk:5070 HTTPS"
        else:
            msg = f"{app} *64 - {host} error : Could not connect through proxy proxy.cse.cuhk.edu.hk:5070 - Proxy server cannot establish a connection with the target, status code 403"
        out.append(f"[{t:%m.%d %H:%M:%S}] {msg}")
    return out


def _openssh(rng, n):
    clock = _Clock(rng, _dt.datetime(2017, 12, 10, 6, 55, 46), 4000)
    ips = ["173.234.31.186", "112.95.230.3", "5.36.59.76", "183.62.140.253", "187.141.143.180"]
    users = ["root", "admin", "test", "oracle", "webmaster", "support"]
    out = []
    for _ in range(n):
        t = clock.tick()
        pid = rng.randint(24000, 29000)
        ip = _ip(rng, ips)
        k = rng.random()
        if k < 0.25:
            msg = f"Failed password for invalid user {rng.choice(users)} from {ip} port {rng.randint(1024, 65535)} ssh2"
        elif k < 0.45:
            msg = f"pam_unix(sshd:auth): authentication failure; logname= uid=0 euid=0 tty=ssh ruser= rhost={ip}"
        elif k < 0.6:
            msg = f"Received disconnect from {ip}: 11: Bye Bye [preauth]"
        elif k < 0.75:
            msg = f"Invalid user {rng.choice(users)} from {ip}"
        elif k < 0.9:
            msg = f"reverse mapping checking getaddrinfo for {_hex(rng, 6)}.example.com [{ip}] failed - POSSIBLE BREAK-IN ATTEMPT!"
        else:
            msg = f"Connection closed by {ip} [preauth]"
        out.append(f"{MONTHS[t.month - 1]} {t.day} {t:%H:%M:%S} LabSZ sshd[{pid}]: {msg}")
    return out


def _openstack(rng, n):
    clock = _Clock(rng, _dt.datetime(2017, 5, 16, 0, 0, 0), 600)
    tenant = _hex(rng, 32)
    user = _hex(rng, 32)
    instances = [_uuid(rng) for _ in range(20)]
    out = []
    for _ in range(n):
        t = clock.tick()
        ts = f"{t:%Y-%m-%d %H:%M:%S}.{t.microsecond // 1000:03d}"
        pid = rng.choice((25746, 2931, 25743))
        req = f"req-{_uuid(rng)}"
        k = rng.random()
        if k < 0.5:
            body = (f"{pid} INFO nova.osapi_compute.wsgi.server [{req} {user} {tenant} - - -] 10.11.10.1 "
                    f"\"GET /v2/{tenant}/servers/detail HTTP/1.1\" status: 200 len: {rng.randint(1500, 2000)} "
                    f"time: {rng.uniform(0.1, 0.4):.7f}")
            fname = "nova-api.log.1.2017-05-16_13:53:08"
        elif k < 0.8:
            body = (f"{pid} INFO nova.compute.manager [{req} - - - - -] [instance: {rng.choice(instances)}] "
                    f"VM {rng.choice(('Started', 'Paused', 'Resumed', 'Stopped'))} (Lifecycle Event)")
            fname = "nova-compute.log.1.2017-05-16_13:55:31"
        else:
            body = (f"{pid} INFO nova.compute.resource_tracker [{req} - - - - -] Final resource view: "
                    f"name=cp-1.slowvm1.tcloud-pg0.utah.cloudlab.us phys_ram=64172MB used_ram={rng.randint(1, 40) * 512}MB "
                    f"phys_disk=15GB used_disk={rng.randint(0, 15)}GB total_vcpus=16 used_vcpus={rng.randint(0, 16)} pci_stats=[]")
            fname = "nova-compute.log.1.2017-05-16_13:55:31"
        out.append(f"{fname} {ts} {body}")
    return out


def _mac(rng, n):
    clock = _Clock(rng, _dt.datetime(2017, 7, 1, 9, 0, 55), 30000)
    hosts = ["calvisitor-10-105-160-95", "authorMacBook-Pro", "calvisitor-10-105-163-202"]
    out = []
    for _ in range(n):
        t = clock.tick()
        h = rng.choice(hosts)
        k = rng.random()
        if k < 0.3:
            msg = (f"kernel[0]: IOThunderboltSwitch<0>(0x0)::listenerCallback - Thunderbolt HPD packet for route = 0x0 "
                   f"port = {rng.randint(10, 12)} unplug = {rng.randint(0, 1)}")
        elif k < 0.5:
            msg = f"kernel[0]: ARPT: {rng.randint(600000, 700000)}.{rng.randint(100000, 999999)}: wl0: MDNS: IPV4 Addr: {_ip(rng)}"
        elif k < 0.7:
            msg = (f"com.apple.CDScheduler[{rng.randint(40, 90)}]: Thermal pressure state: 1 Memory pressure state: 0")
        elif k < 0.85:
            msg = f"QQ[{rng.randint(10000, 20000)}]: FA||Url||taskID[{rng.randint(2019350000, 2019360000)}] dealloc"
        else:
            msg = f"Google Chrome Helper[{rng.randint(30000, 40000)}]: Couldn't set task role to TASK_DARWINBG_APPLICATION (pid={rng.randint(30000, 40000)})"
        out.append(f"{MONTHS[t.month - 1]} {t.day:2d} {t:%H:%M:%S} {h} {msg}")
    return out


GENERATORS: Dict[str, Callable[[random.Random, int], List[str]]] = {
    "HDFS": _hdfs, "Hadoop": _hadoop, "Spark": _spark, "Zookeeper": _zookeeper,
    "BGL": _bgl, "HPC": _hpc, "Thunderbird": _thunderbird, "Windows": _windows,
    "Linux": _linux, "Android": _android, "HealthApp": _healthapp, "Apache": _apache,
    "Proxifier": _proxifier, "OpenSSH": _openssh, "OpenStack": _openstack, "Mac": _mac,
}


def generate(system: str, n_lines: int = 2000, seed: int = 0) -> bytes:
    """``n_lines`` LF-terminated lines in the style of ``system``."""
    if system not in GENERATORS:
        raise KeyError(f"unknown system {system!r}")
    rng = random.Random(f"{system}:{seed}")
    lines = GENERATORS[system](rng, n_lines)
    return ("\n".join(lines) + "\n").encode()


def numeric_heavy(n_lines: int = 20000, seed: int = 0) -> bytes:
    """Lines dominated by unstructured numbers and numeric sub-tokens."""
    rng = random.Random(seed)
    t = 1_500_000_000_000
    out = []
    for i in range(n_lines):
        t += rng.randint(0, 50)
        out.append(
            f"{t} {i} {rng.randint(0, 10**6)} {rng.randint(0, 10**9)} "
            f"{rng.randint(0, 255)}.{rng.randint(0, 255)}.{rng.randint(0, 255)}.{rng.randint(0, 255)} "
            f"{rng.randint(0, 99999)} {rng.randint(0, 10**12)} {rng.randint(10, 99)}:{rng.randint(10, 99)}"
        )
    return ("\n".join(out) + "\n").encode()


def mixed_corpus(n_lines: int = 100_000, seed: int = 1) -> bytes:
    """All systems back to back, ``n_lines`` in total."""
    per, extra = divmod(n_lines, len(SYSTEMS))
    return b"".join(generate(name, per + (i < extra), seed) for i, name in enumerate(SYSTEMS))


def loghub_corpus(n_lines: int = 2000, seed: int = 0) -> Dict[str, bytes]:
    """``{system: bytes}`` from ``$LOGHUB_2K_DIR`` when it is set, otherwise synthetic."""
    root = os.environ.get("LOGHUB_2K_DIR")
    if root:
        out = {}
        for name in SYSTEMS:
            hits = sorted(Path(root).rglob(f"{name}_2k.log"))
            if not hits:
                raise FileNotFoundError(f"{name}_2k.log not found under {root}")
            out[name] = hits[0].read_bytes()
        return out
    return {name: generate(name, n_lines, seed) for name in SYSTEMS}


def write_corpus(directory, n_lines: int = 2000, seed: int = 0) -> List[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, data in loghub_corpus(n_lines, seed).items():
        p = d / f"{name}_2k.log"
        p.write_bytes(data)
        paths.append(p)
    return paths
